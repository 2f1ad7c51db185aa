"""Extract entity/relation facts from Java source trees.

Extraction is purely syntactic: names are resolved through declared types,
the per-file import table and a built-in ``java.lang`` table.  There is no
type inference and no bytecode analysis, so call receivers that cannot be
resolved are recorded against the receiver text as written; provenance
counting later skips such targets.  Parsing is tolerant: a declaration
that cannot be understood is skipped and counted, never fatal.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import DuplicateProjectError, EmptyCorpusError
from .facts import (
    EntityKind,
    FactRelation,
    ProjectFacts,
    RelationKind,
    SourceEntity,
)
from .javalex import ASSIGN_OPS, KEYWORDS, PRIMITIVES, Tok, count_sloc, tokenize

log = logging.getLogger(__name__)

DEFAULT_JDK_PREFIXES: tuple[str, ...] = ("java.", "javax.")

DEFAULT_PACKAGE = "(default)"

PRIMITIVE_BOX = {
    "boolean": "java.lang.Boolean",
    "byte": "java.lang.Byte",
    "char": "java.lang.Character",
    "short": "java.lang.Short",
    "int": "java.lang.Integer",
    "long": "java.lang.Long",
    "float": "java.lang.Float",
    "double": "java.lang.Double",
}

# Types importable without an explicit import.  Used to resolve bare
# references like Integer or System; deliberately limited to common names.
JAVA_LANG_TYPES = frozenset(
    """Object String CharSequence StringBuilder StringBuffer
    Integer Long Double Float Short Byte Character Boolean Void Number
    Math StrictMath System Runtime Process ProcessBuilder
    Thread ThreadGroup ThreadLocal InheritableThreadLocal Runnable
    Class ClassLoader Package Enum Record Iterable Comparable Cloneable
    AutoCloseable Appendable Readable
    Throwable Exception RuntimeException Error
    ArithmeticException ArrayIndexOutOfBoundsException ArrayStoreException
    ClassCastException ClassNotFoundException CloneNotSupportedException
    IllegalAccessException IllegalArgumentException IllegalStateException
    IllegalMonitorStateException IndexOutOfBoundsException
    InstantiationException InterruptedException NegativeArraySizeException
    NoSuchFieldException NoSuchMethodException NullPointerException
    NumberFormatException SecurityException StringIndexOutOfBoundsException
    UnsupportedOperationException
    AssertionError StackOverflowError OutOfMemoryError NoClassDefFoundError
    ExceptionInInitializerError UnsupportedClassVersionError LinkageError
    VirtualMachineError InternalError
    Deprecated Override SuppressWarnings SafeVarargs FunctionalInterface
    StackTraceElement SecurityManager""".split()
)

# Interfaces an anonymous class is likely implementing rather than
# extending, when the supertype is not declared in the project.
KNOWN_JDK_INTERFACES = frozenset(
    """java.lang.Runnable java.lang.Comparable java.lang.Iterable
    java.lang.Cloneable java.lang.AutoCloseable java.lang.Appendable
    java.lang.Readable java.lang.CharSequence java.lang.Thread.UncaughtExceptionHandler
    java.util.Comparator java.util.Iterator java.util.concurrent.Callable
    java.io.Serializable java.io.Closeable java.awt.event.ActionListener""".split()
)

MODIFIER_WORDS = frozenset(
    """public private protected static final abstract native synchronized
    transient volatile strictfp default sealed""".split()
)

_TYPE_KEYWORDS = frozenset(["class", "interface", "enum"])

# Tokens that may legally appear inside a generic argument list in a usage
# position; anything else means "this was a comparison, not a type".
_GENERIC_OK_PUNCT = frozenset([".", ",", "?", "<", ">", "[", "]"])
_GENERIC_OK_WORDS = frozenset(["extends", "super"])

# Tokens that may start an expression immediately after a cast.
_CAST_FOLLOW_PUNCT = frozenset(["(", "!", "~"])
_CAST_FOLLOW_WORDS = frozenset(["new", "this", "super"])

_DECL_BOUNDARY_PUNCT = frozenset([";", "{", "}", "(", ",", ":", "->"])
_DECL_BOUNDARY_WORDS = frozenset(["final", "else", "do"])

_DECL_TERMINATORS = frozenset(["=", ";", ",", ":", ")"])


class Provenance(str, Enum):
    INTERNAL = "INTERNAL"
    JDK = "JDK"
    EXTERNAL = "EXTERNAL"


# ---------------------------------------------------------------------------
# Parse tree (per file)
# ---------------------------------------------------------------------------


@dataclass
class TypeRef:
    base: str
    args: list[str] = field(default_factory=list)
    dims: int = 0


@dataclass
class FieldDecl:
    name: str
    tref: TypeRef
    line: int
    init_raw: list[Tok] = field(default_factory=list)
    stmts: list[Tok] = field(default_factory=list)
    anons: list["TypeDecl"] = field(default_factory=list)
    entity_id: int = 0


@dataclass
class MethodDecl:
    name: str
    ret: TypeRef | None
    params: list[tuple[TypeRef, str]]
    throws: list[TypeRef]
    line: int
    is_ctor: bool = False
    type_params: list[str] = field(default_factory=list)
    type_param_bounds: list[str] = field(default_factory=list)
    body_raw: list[Tok] | None = None
    stmts: list[Tok] = field(default_factory=list)
    anons: list["TypeDecl"] = field(default_factory=list)
    entity_id: int = 0


@dataclass
class InitDecl:
    body_raw: list[Tok]
    line: int
    stmts: list[Tok] = field(default_factory=list)
    anons: list["TypeDecl"] = field(default_factory=list)


@dataclass
class EnumConst:
    name: str
    line: int
    args_raw: list[Tok] = field(default_factory=list)
    body: "TypeDecl | None" = None
    stmts: list[Tok] = field(default_factory=list)
    anons: list["TypeDecl"] = field(default_factory=list)
    entity_id: int = 0


@dataclass
class TypeDecl:
    kind: str  # class | interface | enum | annotation
    name: str | None  # None for anonymous classes
    line: int
    extends: list[TypeRef] = field(default_factory=list)
    implements: list[TypeRef] = field(default_factory=list)
    members: list = field(default_factory=list)  # declaration order
    consts: list[EnumConst] = field(default_factory=list)
    anon_super: TypeRef | None = None
    type_params: list[str] = field(default_factory=list)
    type_param_bounds: list[str] = field(default_factory=list)
    fqn: str = ""
    entity_id: int = 0


@dataclass
class FileSyntax:
    path: str
    package: str | None = None
    imports: dict[str, str] = field(default_factory=dict)  # simple -> fqn
    wildcard_imports: list[str] = field(default_factory=list)
    types: list[TypeDecl] = field(default_factory=list)
    parse_warnings: int = 0


# ---------------------------------------------------------------------------
# Structural parsing
# ---------------------------------------------------------------------------


def _find_matching(toks: list[Tok], i: int, open_t: str, close_t: str) -> int:
    """Index of the token closing the bracket at ``i``, or len(toks)."""
    depth = 0
    n = len(toks)
    while i < n:
        t = toks[i].text
        if t == open_t:
            depth += 1
        elif t == close_t:
            depth -= 1
            if depth == 0:
                return i
        i += 1
    return n


@dataclass
class TypeParams:
    names: list[str] = field(default_factory=list)  # introduced variables
    bounds: list[str] = field(default_factory=list)  # referenced bound types


def _skip_type_params(toks: list[Tok], i: int) -> tuple[TypeParams, int]:
    """Parse a declaration type-parameter list starting at ``<``.

    Collects the introduced type-variable names (identifiers directly after
    ``<`` or a top-level comma) and every other type name mentioned in the
    bounds; returns them with the index past the list.
    """
    depth = 0
    n = len(toks)
    out = TypeParams()
    expect_name = False
    chain: list[str] = []

    def flush() -> None:
        if chain:
            name = ".".join(chain)
            if name not in out.names:
                out.bounds.append(name)
            chain.clear()

    while i < n:
        t = toks[i]
        if t.text == "<":
            flush()
            depth += 1
            expect_name = depth == 1
        elif t.text in (">", ">>", ">>>"):
            flush()
            depth -= {">": 1, ">>": 2, ">>>": 3}[t.text]
        elif t.text == "," and depth == 1:
            flush()
            expect_name = True
        elif t.text in ("{", ";", ")"):
            flush()
            return out, i  # malformed; let the caller cope
        elif t.kind == "word" and t.text not in KEYWORDS:
            if expect_name:
                out.names.append(t.text)
                expect_name = False
            elif not chain or (i > 0 and toks[i - 1].text == "."):
                chain.append(t.text)
            else:
                flush()
                chain.append(t.text)
        elif t.text != ".":
            flush()
        i += 1
        if depth <= 0:
            return out, i
    flush()
    return out, n


def parse_typeref(toks: list[Tok], i: int) -> tuple[TypeRef | None, int]:
    """Parse a type reference in a usage position.

    Returns (None, i) when the tokens at ``i`` do not look like a type.
    Generic arguments are collected by base name; array brackets counted.
    """
    n = len(toks)
    if i >= n or toks[i].kind != "word":
        return None, i
    word = toks[i].text
    if word in PRIMITIVES or word in ("void", "var"):
        ref = TypeRef(base=word)
        i += 1
    elif word in KEYWORDS:
        return None, i
    else:
        segs = [word]
        i += 1
        args: list[str] = []
        # generic args may follow any segment
        if i < n and toks[i].text == "<":
            ok, args_here, i2 = _scan_generic_args(toks, i)
            if not ok:
                args_here, i2 = [], i
            args += args_here
            i = i2
        while (
            i + 1 < n
            and toks[i].text == "."
            and toks[i + 1].kind == "word"
            and toks[i + 1].text not in KEYWORDS
        ):
            segs.append(toks[i + 1].text)
            i += 2
            if i < n and toks[i].text == "<":
                ok, args_here, i2 = _scan_generic_args(toks, i)
                if not ok:
                    break
                args += args_here
                i = i2
        ref = TypeRef(base=".".join(segs), args=args)
    while i + 1 < n and toks[i].text == "[" and toks[i + 1].text == "]":
        ref.dims += 1
        i += 2
    if i < n and toks[i].text == "...":
        ref.dims += 1
        i += 1
    return ref, i


def _scan_generic_args(toks: list[Tok], i: int) -> tuple[bool, list[str], int]:
    """Scan ``<...>`` in a usage position; reject anything un-type-like."""
    assert toks[i].text == "<"
    depth = 0
    names: list[str] = []
    n = len(toks)
    j = i
    cur: list[str] = []

    def flush() -> None:
        if cur:
            names.append(".".join(cur))
            cur.clear()

    while j < n:
        t = toks[j]
        if t.text == "<":
            flush()
            depth += 1
        elif t.text in (">", ">>", ">>>"):
            depth -= {">": 1, ">>": 2, ">>>": 3}[t.text]
            flush()
            if depth <= 0:
                return True, names, j + 1
        elif t.kind == "word":
            if t.text in _GENERIC_OK_WORDS:
                flush()
            elif t.text in KEYWORDS and t.text not in PRIMITIVES:
                return False, [], i
            else:
                cur.append(t.text)
        elif t.text == ".":
            pass
        elif t.text in _GENERIC_OK_PUNCT:
            flush()
        else:
            return False, [], i
        j += 1
    return False, [], i


class _Parser:
    """Recursive-descent structural parser over a token list."""

    def __init__(self, toks: list[Tok], syntax: FileSyntax):
        self.toks = toks
        self.syntax = syntax

    def warn(self) -> None:
        self.syntax.parse_warnings += 1

    # -- helpers ---------------------------------------------------------

    def _skip_annotation(self, i: int) -> int:
        # at '@': @Name or @pkg.Name, optional (...)
        toks = self.toks
        i += 1
        while i + 1 < len(toks) and toks[i].kind == "word" and toks[i + 1].text == ".":
            i += 2
        if i < len(toks) and toks[i].kind == "word":
            i += 1
        if i < len(toks) and toks[i].text == "(":
            i = _find_matching(toks, i, "(", ")") + 1
        return i

    def _skip_mods_annotations(self, i: int) -> int:
        toks = self.toks
        while i < len(toks):
            t = toks[i]
            if t.text == "@" and i + 1 < len(toks) and toks[i + 1].text != "interface":
                i = self._skip_annotation(i)
            elif t.kind == "word" and t.text in MODIFIER_WORDS:
                # 'default' only acts as a modifier when not a switch label
                if t.text == "default" and i + 1 < len(toks) and toks[i + 1].text == ":":
                    return i
                i += 1
            elif t.kind == "word" and t.text == "non":
                # tolerate 'non-sealed' lexed as ['non', '-', 'sealed']
                if i + 2 < len(toks) and toks[i + 1].text == "-" and toks[i + 2].text == "sealed":
                    i += 3
                else:
                    return i
            else:
                return i
        return i

    def _skip_to_member_boundary(self, i: int) -> int:
        toks = self.toks
        depth = 0
        while i < len(toks):
            t = toks[i].text
            if t == "{":
                i = _find_matching(toks, i, "{", "}") + 1
                if depth == 0:
                    return i
                continue
            if t == ";" and depth == 0:
                return i + 1
            if t == "(":
                depth += 1
            elif t == ")":
                if depth == 0:
                    return i
                depth -= 1
            elif t == "}" and depth == 0:
                return i
            i += 1
        return i

    def _typeref_list(self, i: int) -> tuple[list[TypeRef], int]:
        refs: list[TypeRef] = []
        toks = self.toks
        while True:
            while i < len(toks) and toks[i].text == "@":
                i = self._skip_annotation(i)
            ref, i = parse_typeref(toks, i)
            if ref is None:
                break
            refs.append(ref)
            if i < len(toks) and toks[i].text == ",":
                i += 1
                continue
            break
        return refs, i

    # -- file level ------------------------------------------------------

    def parse_file(self) -> None:
        toks = self.toks
        i = 0
        n = len(toks)
        while i < n:
            t = toks[i]
            if t.text == ";":
                i += 1
                continue
            if t.text == "@" and i + 1 < n and toks[i + 1].text != "interface":
                i = self._skip_annotation(i)
                continue
            if t.kind == "word" and t.text == "package":
                segs = []
                i += 1
                while i < n and toks[i].kind == "word":
                    segs.append(toks[i].text)
                    i += 1
                    if i < n and toks[i].text == ".":
                        i += 1
                    else:
                        break
                self.syntax.package = ".".join(segs) if segs else None
                while i < n and toks[i].text != ";":
                    i += 1
                i += 1
                continue
            if t.kind == "word" and t.text == "import":
                i = self._parse_import(i)
                continue
            decl, i2 = self._try_type_decl(i)
            if decl is not None:
                self.syntax.types.append(decl)
                i = i2
                continue
            self.warn()
            i = self._skip_to_member_boundary(i + 1)

    def _parse_import(self, i: int) -> int:
        toks = self.toks
        n = len(toks)
        i += 1
        is_static = False
        if i < n and toks[i].text == "static":
            is_static = True
            i += 1
        segs: list[str] = []
        wildcard = False
        while i < n and toks[i].text != ";":
            if toks[i].kind == "word":
                segs.append(toks[i].text)
            elif toks[i].text == "*":
                wildcard = True
            i += 1
        i += 1
        if not segs:
            return i
        if is_static:
            return i  # static imports do not feed type resolution
        if wildcard:
            self.syntax.wildcard_imports.append(".".join(segs))
        else:
            self.syntax.imports[segs[-1]] = ".".join(segs)
        return i

    # -- type declarations -----------------------------------------------

    def _try_type_decl(self, i: int) -> tuple[TypeDecl | None, int]:
        toks = self.toks
        n = len(toks)
        j = self._skip_mods_annotations(i)
        if j >= n:
            return None, i
        t = toks[j]
        if t.text == "@" and j + 1 < n and toks[j + 1].text == "interface":
            return self._parse_type_decl(j + 2, "annotation", toks[j].line)
        if t.kind == "word" and t.text in _TYPE_KEYWORDS:
            return self._parse_type_decl(j + 1, t.text, t.line)
        if (
            t.kind == "word"
            and t.text == "record"
            and j + 2 < n
            and toks[j + 1].kind == "word"
            and toks[j + 2].text in ("(", "<")
        ):
            return self._parse_record_decl(j + 1, t.line)
        return None, i

    def _parse_type_decl(self, i: int, kind: str, line: int) -> tuple[TypeDecl | None, int]:
        toks = self.toks
        n = len(toks)
        if i >= n or toks[i].kind != "word":
            self.warn()
            return None, self._skip_to_member_boundary(i)
        decl = TypeDecl(kind=kind, name=toks[i].text, line=line)
        i += 1
        if i < n and toks[i].text == "<":
            tp, i = _skip_type_params(toks, i)
            decl.type_params, decl.type_param_bounds = tp.names, tp.bounds
        while i < n and toks[i].text != "{":
            t = toks[i]
            if t.kind == "word" and t.text == "extends":
                decl.extends, i = self._typeref_list(i + 1)
            elif t.kind == "word" and t.text == "implements":
                decl.implements, i = self._typeref_list(i + 1)
            elif t.kind == "word" and t.text == "permits":
                _, i = self._typeref_list(i + 1)
            else:
                i += 1
        if i >= n:
            self.warn()
            return decl, n
        end = _find_matching(toks, i, "{", "}")
        if kind == "enum":
            self._parse_enum_body(decl, i + 1, end)
        else:
            self._parse_members(decl, i + 1, end)
        return decl, end + 1

    def _parse_record_decl(self, i: int, line: int) -> tuple[TypeDecl | None, int]:
        toks = self.toks
        n = len(toks)
        decl = TypeDecl(kind="class", name=toks[i].text, line=line)
        i += 1
        if i < n and toks[i].text == "<":
            tp, i = _skip_type_params(toks, i)
            decl.type_params, decl.type_param_bounds = tp.names, tp.bounds
        if i < n and toks[i].text == "(":
            end = _find_matching(toks, i, "(", ")")
            params = self._parse_params(i, end)
            for tref, name in params:
                decl.members.append(FieldDecl(name=name, tref=tref, line=line))
            i = end + 1
        while i < n and toks[i].text != "{":
            if toks[i].kind == "word" and toks[i].text == "implements":
                decl.implements, i = self._typeref_list(i + 1)
            else:
                i += 1
        if i >= n:
            self.warn()
            return decl, n
        end = _find_matching(toks, i, "{", "}")
        self._parse_members(decl, i + 1, end)
        return decl, end + 1

    def _parse_params(self, i_open: int, i_close: int) -> list[tuple[TypeRef, str]]:
        toks = self.toks
        params: list[tuple[TypeRef, str]] = []
        i = i_open + 1
        while i < i_close:
            while i < i_close and toks[i].text == "@":
                i = self._skip_annotation(i)
            while i < i_close and toks[i].kind == "word" and toks[i].text == "final":
                i += 1
            ref, i2 = parse_typeref(toks, i)
            if ref is None:
                i += 1
                continue
            i = i2
            if i < i_close and toks[i].kind == "word":
                name = toks[i].text
                i += 1
                while i + 1 < i_close and toks[i].text == "[" and toks[i + 1].text == "]":
                    ref.dims += 1
                    i += 2
                params.append((ref, name))
            while i < i_close and toks[i].text != ",":
                i += 1
            i += 1
        return params

    def _parse_members(self, decl: TypeDecl, i: int, end: int) -> None:
        toks = self.toks
        while i < end:
            t = toks[i]
            if t.text == ";":
                i += 1
                continue
            nested, i2 = self._try_type_decl(i)
            if nested is not None:
                decl.members.append(nested)
                i = i2
                continue
            j = self._skip_mods_annotations(i)
            if j >= end:
                break
            t = toks[j]
            if t.text == "{":
                blk_end = _find_matching(toks, j, "{", "}")
                decl.members.append(InitDecl(body_raw=toks[j + 1 : blk_end], line=t.line))
                i = blk_end + 1
                continue
            method_tp: TypeParams | None = None
            if t.text == "<":
                method_tp, j = _skip_type_params(toks, j)
                if j < end:
                    t = toks[j]
                else:
                    break
            member, i2 = self._parse_member_after_mods(decl, j, end)
            if member is None:
                self.warn()
                i = self._skip_to_member_boundary(j + 1)
            else:
                if isinstance(member, MethodDecl) and method_tp is not None:
                    member.type_params = method_tp.names
                    member.type_param_bounds = method_tp.bounds
                i = i2

    def _parse_member_after_mods(
        self, decl: TypeDecl, i: int, end: int
    ) -> tuple[object | None, int]:
        toks = self.toks
        ref, j = parse_typeref(toks, i)
        if ref is None:
            return None, i
        if j < end and toks[j].text == "(":
            # constructor: the "type" was actually the class name
            if ref.base == decl.name and ref.dims == 0:
                return self._parse_callable(decl, None, decl.name, True, j, toks[i].line, end)
            return None, i
        if j >= end or toks[j].kind != "word":
            return None, i
        name = toks[j].text
        after = j + 1
        if after < end and toks[after].text == "(":
            return self._parse_callable(decl, ref, name, False, after, toks[i].line, end)
        if after <= end and (after >= end or toks[after].text in ("=", ";", ",", "[")):
            return self._parse_fields(decl, ref, name, after, toks[i].line, end)
        return None, i

    def _parse_callable(
        self,
        decl: TypeDecl,
        ret: TypeRef | None,
        name: str,
        is_ctor: bool,
        i_open: int,
        line: int,
        end: int,
    ) -> tuple[MethodDecl | None, int]:
        toks = self.toks
        close = _find_matching(toks, i_open, "(", ")")
        params = self._parse_params(i_open, close)
        i = close + 1
        throws: list[TypeRef] = []
        while i < end and toks[i].text not in ("{", ";"):
            if toks[i].kind == "word" and toks[i].text == "throws":
                throws, i = self._typeref_list(i + 1)
            elif toks[i].kind == "word" and toks[i].text == "default":
                # annotation member default value
                while i < end and toks[i].text != ";":
                    i += 1
            else:
                i += 1
        member = MethodDecl(
            name=name, ret=ret, params=params, throws=throws, line=line, is_ctor=is_ctor
        )
        if i < end and toks[i].text == "{":
            blk_end = _find_matching(toks, i, "{", "}")
            member.body_raw = toks[i + 1 : blk_end]
            i = blk_end + 1
        else:
            i += 1
        decl.members.append(member)
        return member, i

    def _parse_fields(
        self, decl: TypeDecl, ref: TypeRef, first_name: str, i: int, line: int, end: int
    ) -> tuple[FieldDecl | None, int]:
        toks = self.toks
        name = first_name
        first: FieldDecl | None = None
        while True:
            fd = FieldDecl(name=name, tref=ref, line=line)
            if first is None:
                first = fd
            while i < end and toks[i].text == "[" and i + 1 < end and toks[i + 1].text == "]":
                i += 2
            if i < end and toks[i].text == "=":
                start = i + 1
                depth = 0
                while i < end:
                    t = toks[i].text
                    if t in ("(", "[", "{"):
                        depth += 1
                    elif t in (")", "]", "}"):
                        depth -= 1
                    elif t in (";", ",") and depth == 0:
                        break
                    i += 1
                fd.init_raw = toks[start:i]
            decl.members.append(fd)
            if i < end and toks[i].text == ",":
                i += 1
                if i < end and toks[i].kind == "word":
                    name = toks[i].text
                    i += 1
                    continue
            break
        while i < end and toks[i].text != ";":
            i += 1
        return first, i + 1

    def _parse_enum_body(self, decl: TypeDecl, i: int, end: int) -> None:
        toks = self.toks
        # constants come first, up to ';' or the closing brace
        while i < end:
            while i < end and toks[i].text == "@":
                i = self._skip_annotation(i)
            t = toks[i] if i < end else None
            if t is None or t.text == ";":
                i += 1
                break
            if t.kind != "word":
                break
            const = EnumConst(name=t.text, line=t.line)
            i += 1
            if i < end and toks[i].text == "(":
                close = _find_matching(toks, i, "(", ")")
                const.args_raw = toks[i + 1 : close]
                i = close + 1
            if i < end and toks[i].text == "{":
                close = _find_matching(toks, i, "{", "}")
                body = TypeDecl(
                    kind="class",
                    name=None,
                    line=toks[i].line,
                    anon_super=TypeRef(base=decl.name or ""),
                )
                self._parse_members(body, i + 1, close)
                const.body = body
                i = close + 1
            decl.consts.append(const)
            if i < end and toks[i].text == ",":
                i += 1
                continue
            if i < end and toks[i].text == ";":
                i += 1
                break
        self._parse_members(decl, i, end)


# ---------------------------------------------------------------------------
# Anonymous class extraction from raw statement tokens
# ---------------------------------------------------------------------------


def _extract_anons(
    raw: list[Tok], parser: _Parser
) -> tuple[list[Tok], list[TypeDecl]]:
    """Split raw body tokens into a flat statement stream plus anonymous
    and local type declarations.  A ``Tok('anon', idx, line)`` marker is
    left where an anonymous class body was removed."""
    out: list[Tok] = []
    anons: list[TypeDecl] = []
    i = 0
    n = len(raw)
    while i < n:
        t = raw[i]
        if t.kind == "word" and t.text == "new":
            ref, j = parse_typeref(raw, i + 1)
            if ref is not None and j < n and raw[j].text == "(":
                close = _find_matching(raw, j, "(", ")")
                out.append(t)
                out.extend(raw[i + 1 : j])
                out.append(raw[j])
                inner, inner_anons = _extract_anons(raw[j + 1 : close], parser)
                out.extend(inner)
                anons.extend(inner_anons)
                if close < n:
                    out.append(raw[close])
                i = close + 1
                if i < n and raw[i].text == "{":
                    blk_end = _find_matching(raw, i, "{", "}")
                    body = TypeDecl(
                        kind="class", name=None, line=raw[i].line, anon_super=ref
                    )
                    sub = _Parser(raw[i + 1 : blk_end], parser.syntax)
                    sub._parse_members(body, 0, blk_end - i - 1)
                    anons.append(body)
                    out.append(Tok("anon", str(len(anons) - 1), raw[i].line))
                    i = blk_end + 1
                continue
            out.append(t)
            i += 1
            continue
        if (
            t.kind == "word"
            and t.text in _TYPE_KEYWORDS
            and not (out and out[-1].text == ".")
            and i + 1 < n
            and raw[i + 1].kind == "word"
        ):
            # local type declaration
            sub = _Parser(raw, parser.syntax)
            decl, i2 = sub._parse_type_decl(i + 1, t.text, t.line)
            if decl is not None and decl.members is not None and i2 > i:
                anons.append(decl)
                i = i2
                continue
        out.append(t)
        i += 1
    return out, anons


def _process_bodies(decl: TypeDecl, parser: _Parser) -> None:
    for member in decl.members:
        if isinstance(member, TypeDecl):
            _process_bodies(member, parser)
        elif isinstance(member, MethodDecl) and member.body_raw is not None:
            member.stmts, member.anons = _extract_anons(member.body_raw, parser)
            for anon in member.anons:
                _process_bodies(anon, parser)
        elif isinstance(member, InitDecl):
            member.stmts, member.anons = _extract_anons(member.body_raw, parser)
            for anon in member.anons:
                _process_bodies(anon, parser)
        elif isinstance(member, FieldDecl) and member.init_raw:
            member.stmts, member.anons = _extract_anons(member.init_raw, parser)
            for anon in member.anons:
                _process_bodies(anon, parser)
    for const in decl.consts:
        const.stmts, const.anons = _extract_anons(const.args_raw, parser)
        for anon in const.anons:
            _process_bodies(anon, parser)
        if const.body is not None:
            _process_bodies(const.body, parser)


def parse_java_file(path_text: str, text: str) -> FileSyntax:
    """Parse one Java compilation unit into its structural summary."""
    syntax = FileSyntax(path=path_text)
    parser = _Parser(tokenize(text), syntax)
    parser.parse_file()
    for decl in syntax.types:
        _process_bodies(decl, parser)
    return syntax


# ---------------------------------------------------------------------------
# Project-level symbol index and entity building
# ---------------------------------------------------------------------------


_KIND_MAP = {
    "class": EntityKind.CLASS,
    "interface": EntityKind.INTERFACE,
    "enum": EntityKind.ENUM,
    "annotation": EntityKind.ANNOTATION,
}


@dataclass
class _TypeInfo:
    decl: TypeDecl
    file: FileSyntax
    package: str
    fields: dict[str, FieldDecl] = field(default_factory=dict)
    methods: dict[str, MethodDecl] = field(default_factory=dict)
    ctors: list[MethodDecl] = field(default_factory=list)
    outer: "_TypeInfo | None" = None


class _ProjectBuilder:
    def __init__(self, project_id: str, first_id: int):
        self.project_id = project_id
        self.next_id = first_id
        self.entities: list[SourceEntity] = []
        self.relations: list[FactRelation] = []
        self.packages: dict[str, int] = {}
        self.types: dict[str, _TypeInfo] = {}
        self.all_infos: list[_TypeInfo] = []  # declaration order, no overwrites
        self.simple_index: dict[str, list[str]] = {}

    def _new_entity(self, fqn: str, kind: EntityKind, file: str, line: int) -> int:
        eid = self.next_id
        self.next_id += 1
        self.entities.append(
            SourceEntity(
                entity_id=eid,
                fqn=fqn,
                kind=kind,
                project_id=self.project_id,
                file=file,
                line=line,
            )
        )
        return eid

    def package_entity(self, name: str) -> int:
        if name not in self.packages:
            self.packages[name] = self._new_entity(name, EntityKind.PACKAGE, "", 0)
        return self.packages[name]

    def add_file(self, syntax: FileSyntax) -> None:
        pkg = syntax.package or DEFAULT_PACKAGE
        pkg_eid = self.package_entity(pkg)
        prefix = syntax.package or ""
        for decl in syntax.types:
            self._add_type(decl, syntax, prefix, pkg_eid, outer=None)

    def _register(self, fqn: str, info: _TypeInfo) -> None:
        self.types.setdefault(fqn, info)
        self.all_infos.append(info)
        simple = fqn.rsplit(".", 1)[-1].rsplit("$", 1)[-1]
        self.simple_index.setdefault(simple, []).append(fqn)

    def _add_type(
        self,
        decl: TypeDecl,
        syntax: FileSyntax,
        prefix: str,
        parent_eid: int,
        outer: _TypeInfo | None,
        fqn_override: str | None = None,
    ) -> _TypeInfo:
        if fqn_override is not None:
            fqn = fqn_override
        elif prefix:
            fqn = f"{prefix}.{decl.name}"
        else:
            fqn = decl.name or "(anonymous)"
        decl.fqn = fqn
        decl.entity_id = self._new_entity(
            fqn, _KIND_MAP[decl.kind], syntax.path, decl.line
        )
        self.relations.append(
            FactRelation(parent_eid, RelationKind.CONTAINS, decl.entity_id)
        )
        info = _TypeInfo(
            decl=decl, file=syntax, package=syntax.package or "", outer=outer
        )
        self._register(fqn, info)
        anon_counter = 0
        for member in decl.members:
            if isinstance(member, TypeDecl):
                self._add_type(member, syntax, fqn, decl.entity_id, outer=info)
            elif isinstance(member, FieldDecl):
                member.entity_id = self._new_entity(
                    f"{fqn}.{member.name}", EntityKind.FIELD, syntax.path, member.line
                )
                self.relations.append(
                    FactRelation(decl.entity_id, RelationKind.CONTAINS, member.entity_id)
                )
                info.fields.setdefault(member.name, member)
                anon_counter = self._add_anons(member.anons, syntax, fqn, decl, info, anon_counter)
            elif isinstance(member, MethodDecl):
                if member.is_ctor:
                    member.entity_id = self._new_entity(
                        f"{fqn}.<init>", EntityKind.CONSTRUCTOR, syntax.path, member.line
                    )
                    info.ctors.append(member)
                else:
                    member.entity_id = self._new_entity(
                        f"{fqn}.{member.name}", EntityKind.METHOD, syntax.path, member.line
                    )
                    info.methods.setdefault(member.name, member)
                self.relations.append(
                    FactRelation(decl.entity_id, RelationKind.CONTAINS, member.entity_id)
                )
                anon_counter = self._add_anons(member.anons, syntax, fqn, decl, info, anon_counter)
            elif isinstance(member, InitDecl):
                anon_counter = self._add_anons(member.anons, syntax, fqn, decl, info, anon_counter)
        for const in decl.consts:
            const.entity_id = self._new_entity(
                f"{fqn}.{const.name}", EntityKind.FIELD, syntax.path, const.line
            )
            self.relations.append(
                FactRelation(decl.entity_id, RelationKind.CONTAINS, const.entity_id)
            )
            anon_counter = self._add_anons(const.anons, syntax, fqn, decl, info, anon_counter)
            if const.body is not None:
                anon_counter += 1
                self._add_type(
                    const.body,
                    syntax,
                    "",
                    decl.entity_id,
                    outer=info,
                    fqn_override=f"{fqn}${anon_counter}",
                )
        return info

    def _add_anons(
        self,
        anons: list[TypeDecl],
        syntax: FileSyntax,
        fqn: str,
        decl: TypeDecl,
        info: _TypeInfo,
        counter: int,
    ) -> int:
        for anon in anons:
            counter += 1
            if anon.name is not None:
                # named local class: binary-style nested name
                self._add_type(
                    anon, syntax, "", decl.entity_id, outer=info,
                    fqn_override=f"{fqn}${anon.name}",
                )
            else:
                self._add_type(
                    anon, syntax, "", decl.entity_id, outer=info,
                    fqn_override=f"{fqn}${counter}",
                )
        return counter


# ---------------------------------------------------------------------------
# Name resolution + relation emission
# ---------------------------------------------------------------------------


class _Resolver:
    def __init__(self, builder: _ProjectBuilder):
        self.b = builder

    def resolve(
        self, name: str, syntax: FileSyntax, chain: list[_TypeInfo]
    ) -> str | None:
        """Resolve a source type name to a dotted FQN, or None."""
        if not name:
            return None
        if name in PRIMITIVE_BOX:
            return PRIMITIVE_BOX[name]
        if name in ("void", "var"):
            return None
        if "." in name:
            if name in self.b.types:
                return name
            head, rest = name.split(".", 1)
            head_fqn = self._resolve_simple(head, syntax, chain)
            if head_fqn is not None:
                return f"{head_fqn}.{rest}"
            return name  # qualified as written
        return self._resolve_simple(name, syntax, chain)

    def _resolve_simple(
        self, name: str, syntax: FileSyntax, chain: list[_TypeInfo]
    ) -> str | None:
        for info in chain:
            if info.decl.name == name:
                return info.decl.fqn
            for member in info.decl.members:
                if isinstance(member, TypeDecl) and member.name == name:
                    return member.fqn
        for decl in syntax.types:
            if decl.name == name:
                return decl.fqn
        pkg = syntax.package
        if pkg:
            cand = f"{pkg}.{name}"
            if cand in self.b.types:
                return cand
        elif name in self.b.types:
            return name
        if name in syntax.imports:
            return syntax.imports[name]
        for wpkg in syntax.wildcard_imports:
            cand = f"{wpkg}.{name}"
            if cand in self.b.types:
                return cand
        if name in JAVA_LANG_TYPES:
            return f"java.lang.{name}"
        if len(syntax.wildcard_imports) == 1:
            return f"{syntax.wildcard_imports[0]}.{name}"
        return None


class _BodyAnalyzer:
    """Token-pattern analysis of one member body."""

    def __init__(
        self,
        builder: _ProjectBuilder,
        resolver: _Resolver,
        syntax: FileSyntax,
        chain: list[_TypeInfo],
        source_id: int,
        anons: list[TypeDecl],
    ):
        self.b = builder
        self.r = resolver
        self.syntax = syntax
        self.chain = chain
        self.source = source_id
        self.anons = anons
        self.locals: dict[str, TypeRef | None] = {}
        self.consumed: set[int] = set()  # token indexes already emitted
        self.type_params: set[str] = set()
        for info in chain:
            self.type_params.update(info.decl.type_params)
        # member lookup also sees fields/methods inherited from internal
        # superclasses; type-name resolution stays lexical
        self.lookup_chain = self._expand_with_internal_supers(chain)

    def _expand_with_internal_supers(
        self, chain: list[_TypeInfo]
    ) -> list[_TypeInfo]:
        out: list[_TypeInfo] = []
        seen: set[int] = set()
        for info in chain:
            cur: _TypeInfo | None = info
            while cur is not None and id(cur) not in seen:
                seen.add(id(cur))
                out.append(cur)
                refs = cur.decl.extends or (
                    [cur.decl.anon_super] if cur.decl.anon_super else []
                )
                prev = cur
                cur = None
                if refs:
                    fqn = self.r.resolve(refs[0].base, prev.file, [prev])
                    if fqn is not None and fqn in self.b.types:
                        nxt = self.b.types[fqn]
                        if nxt.decl.kind in ("class", "enum"):
                            cur = nxt
        return out

    # -- small helpers ----------------------------------------------------

    def emit(self, kind: RelationKind, target: int | str) -> None:
        self.b.relations.append(FactRelation(self.source, kind, target))

    def resolve_type(self, name: str) -> str | None:
        return self.r.resolve(name, self.syntax, self.chain)

    def emit_type_use(self, kind: RelationKind, name: str) -> None:
        if name in ("void", "var") or not name or name in self.type_params:
            return
        resolved = self.resolve_type(name)
        target = resolved if resolved is not None else name
        if isinstance(target, str) and target in self.b.types:
            self.emit(kind, self.b.types[target].decl.entity_id)
        else:
            self.emit(kind, target)

    def find_field(self, name: str) -> FieldDecl | None:
        for info in self.lookup_chain:
            if name in info.fields:
                return info.fields[name]
        return None

    def find_method(self, name: str) -> tuple[str, MethodDecl | None] | None:
        """Nearest enclosing or inherited declarer of ``name``."""
        for info in self.lookup_chain:
            if name in info.methods:
                return info.decl.fqn, info.methods[name]
        return None

    def _call_target(self, owner_fqn: str, rest: list[str], name: str) -> int | str:
        if owner_fqn in self.b.types and not rest:
            m = self.b.types[owner_fqn].methods.get(name)
            if m is not None:
                return m.entity_id
        parts = [owner_fqn, *rest, name]
        return ".".join(parts)

    def _ctor_target(self, owner_fqn: str) -> int | str:
        info = self.b.types.get(owner_fqn)
        if info is not None and info.ctors:
            return info.ctors[0].entity_id
        return f"{owner_fqn}.<init>"

    # -- main scan --------------------------------------------------------

    def run(self, toks: list[Tok]) -> None:
        i = 0
        n = len(toks)
        prev: Tok | None = None
        while i < n:
            t = toks[i]
            if t.kind == "anon":
                i += 1
                prev = t
                continue
            if t.kind == "word" and t.text == "new":
                i = self._handle_new(toks, i)
                prev = t
                continue
            if t.kind == "word" and t.text == "this":
                i = self._handle_this_super(toks, i, is_super=False)
                prev = t
                continue
            if t.kind == "word" and t.text == "super":
                i = self._handle_this_super(toks, i, is_super=True)
                prev = t
                continue
            if t.kind == "word" and t.text == "instanceof":
                ref, j = parse_typeref(toks, i + 1)
                if ref is not None:
                    self.emit_type_use(RelationKind.INSTANCEOF, ref.base)
                    if j < n and toks[j].kind == "word" and toks[j].text not in KEYWORDS:
                        self.locals[toks[j].text] = ref
                        j += 1
                    i = j
                else:
                    i += 1
                prev = t
                continue
            if t.text == "(" and t.kind == "punct":
                consumed = self._try_cast(toks, i)
                if consumed is not None:
                    prev = t
                    i = consumed
                    continue
                i += 1
                prev = t
                continue
            if t.kind == "word" and (t.text not in KEYWORDS or t.text in PRIMITIVES):
                i = self._handle_word(toks, i, prev)
                prev = t
                continue
            i += 1
            prev = t
        return

    def _handle_new(self, toks: list[Tok], i: int) -> int:
        n = len(toks)
        ref, j = parse_typeref(toks, i + 1)
        if ref is None:
            return i + 1
        for arg in ref.args:
            self.emit_type_use(RelationKind.USES, arg)
        if j < n and toks[j].text == "(":
            close = _find_matching(toks, j, "(", ")")
            after = toks[close + 1] if close + 1 < n else None
            if after is not None and after.kind == "anon":
                anon = self.anons[int(after.text)]
                self.emit(RelationKind.INSTANTIATES, f"{anon.fqn}.<init>")
            else:
                resolved = self.resolve_type(ref.base)
                owner = resolved if resolved is not None else ref.base
                self.emit(RelationKind.INSTANTIATES, self._ctor_target(owner))
                # chained call on the fresh instance: new T(...).m(...)
                if (
                    after is not None
                    and after.text == "."
                    and close + 2 < n
                    and toks[close + 2].kind == "word"
                    and close + 3 < n
                    and toks[close + 3].text == "("
                ):
                    name = toks[close + 2].text
                    self.emit(
                        RelationKind.CALLS, self._call_target(owner, [], name)
                    )
                    self.consumed.add(close + 2)
            return j + 1  # scan proceeds into the constructor args
        if j < n and toks[j].text == "[":
            self.emit_type_use(RelationKind.USES, ref.base)
            return j + 1
        if ref.dims:
            # new T[]{...} array creation with initializer
            self.emit_type_use(RelationKind.USES, ref.base)
        return j

    def _handle_this_super(self, toks: list[Tok], i: int, is_super: bool) -> int:
        n = len(toks)
        own = self.chain[0] if self.chain else None
        nxt = toks[i + 1] if i + 1 < n else None
        if nxt is not None and nxt.text == "(" and own is not None:
            if is_super:
                supers = own.decl.extends or (
                    [own.decl.anon_super] if own.decl.anon_super else []
                )
                if supers:
                    resolved = self.resolve_type(supers[0].base)
                    owner = resolved if resolved is not None else supers[0].base
                    self.emit(RelationKind.CALLS, self._ctor_target(owner))
            else:
                self.emit(RelationKind.CALLS, self._ctor_target(own.decl.fqn))
            return i + 1
        if nxt is not None and nxt.text == "::" and i + 2 < n and toks[i + 2].kind == "word":
            name = toks[i + 2].text
            if own is not None:
                if name == "new":
                    self.emit(RelationKind.INSTANTIATES, self._ctor_target(own.decl.fqn))
                elif not is_super:
                    self.emit(RelationKind.CALLS, self._call_target(own.decl.fqn, [], name))
                else:
                    supers = own.decl.extends or (
                        [own.decl.anon_super] if own.decl.anon_super else []
                    )
                    if supers:
                        resolved = self.resolve_type(supers[0].base)
                        owner = resolved if resolved is not None else supers[0].base
                        self.emit(RelationKind.CALLS, self._call_target(owner, [], name))
            return i + 3
        if nxt is not None and nxt.text == "." and i + 2 < n and toks[i + 2].kind == "word":
            name = toks[i + 2].text
            after = toks[i + 3] if i + 3 < n else None
            if after is not None and after.text == "(" and own is not None:
                if is_super:
                    supers = own.decl.extends or (
                        [own.decl.anon_super] if own.decl.anon_super else []
                    )
                    if supers:
                        resolved = self.resolve_type(supers[0].base)
                        owner = resolved if resolved is not None else supers[0].base
                        self.emit(RelationKind.CALLS, self._call_target(owner, [], name))
                    else:
                        self.emit(RelationKind.CALLS, name)
                else:
                    self.emit(
                        RelationKind.CALLS, self._call_target(own.decl.fqn, [], name)
                    )
                return i + 3
            # this.f / super.f field access
            fd = self.find_field(name)
            if fd is not None and not is_super:
                self._emit_field_access(toks, i + 2, fd)
            return i + 3
        return i + 1

    def _try_cast(self, toks: list[Tok], i: int) -> int | None:
        n = len(toks)
        ref, j = parse_typeref(toks, i + 1)
        if ref is None or j >= n or toks[j].text != ")":
            return None
        nxt = toks[j + 1] if j + 1 < n else None
        if nxt is None:
            return None
        ok = (
            nxt.kind in ("num", "str", "char")
            or (nxt.kind == "word" and (nxt.text not in KEYWORDS or nxt.text in _CAST_FOLLOW_WORDS))
            or (nxt.kind == "punct" and nxt.text in _CAST_FOLLOW_PUNCT)
        )
        if not ok:
            return None
        if (
            "." not in ref.base
            and not ref.args
            and ref.dims == 0
            and ref.base not in PRIMITIVE_BOX
        ):
            # A bare lowercase name that resolves to nothing is far more
            # likely a parenthesised expression than a cast.
            if ref.base in self.locals or self.find_field(ref.base) is not None:
                return None
            if not ref.base[:1].isupper() and self.resolve_type(ref.base) is None:
                return None
        self.emit_type_use(RelationKind.CASTS, ref.base)
        for arg in ref.args:
            self.emit_type_use(RelationKind.USES, arg)
        return j + 1

    def _handle_word(self, toks: list[Tok], i: int, prev: Tok | None) -> int:
        n = len(toks)
        if i in self.consumed:
            return i + 1
        if prev is not None and prev.text == ".":
            # member of an expression value: receiver type unknown
            if i + 1 < n and toks[i + 1].text == "(":
                self.emit(RelationKind.CALLS, toks[i].text)
            return i + 1
        # local variable declaration?
        boundary = (
            prev is None
            or (prev.kind == "punct" and prev.text in _DECL_BOUNDARY_PUNCT)
            or (prev.kind == "word" and prev.text in _DECL_BOUNDARY_WORDS)
            or prev.kind == "anon"
        )
        if boundary:
            ref, j = parse_typeref(toks, i)
            if (
                ref is not None
                and j < n
                and toks[j].kind == "word"
                and toks[j].text not in KEYWORDS
                and (j + 1 >= n or toks[j + 1].text in _DECL_TERMINATORS)
            ):
                varname = toks[j].text
                self.locals[varname] = None if ref.base in ("var",) else ref
                if ref.base not in ("var",):
                    self.emit_type_use(RelationKind.USES, ref.base)
                    for arg in ref.args:
                        self.emit_type_use(RelationKind.USES, arg)
                return j + 1
        # dotted name chain
        segs = [toks[i].text]
        j = i + 1
        while (
            j + 1 < n
            and toks[j].text == "."
            and toks[j + 1].kind == "word"
            and toks[j + 1].text not in KEYWORDS
        ):
            segs.append(toks[j + 1].text)
            j += 2
        after = toks[j] if j < n else None
        if after is not None and after.text == "(":
            self._emit_call(segs)
            return j
        if after is not None and after.text == "::" and j + 1 < n and toks[j + 1].kind == "word":
            ref_name = toks[j + 1].text
            if ref_name == "new":
                resolved = self.resolve_type(".".join(segs))
                owner = resolved if resolved is not None else ".".join(segs)
                self.emit(RelationKind.INSTANTIATES, self._ctor_target(owner))
            else:
                self._emit_call(segs + [ref_name])
            return j + 2
        self._emit_name_use(toks, i, j - 1, segs, prev)
        return j

    def _emit_call(self, segs: list[str]) -> None:
        name = segs[-1]
        receiver = segs[:-1]
        if not receiver:
            found = self.find_method(name)
            if found is not None:
                _owner_fqn, decl = found
                self.emit(RelationKind.CALLS, decl.entity_id)
            else:
                self.emit(RelationKind.CALLS, name)
            return
        head = receiver[0]
        rest = receiver[1:]
        owner: str | None = None
        if head in self.locals:
            ref = self.locals[head]
            owner = self.resolve_type(ref.base) if ref is not None else None
            if owner is None:
                self.emit(RelationKind.CALLS, ".".join(segs))
                return
        else:
            fd = self.find_field(head)
            if fd is not None:
                owner = self.resolve_type(fd.tref.base)
                if owner is None:
                    self.emit(RelationKind.CALLS, ".".join(segs))
                    return
            else:
                owner = self.resolve_type(head)
        if owner is None:
            # unresolved receiver; keep the raw text
            self.emit(RelationKind.CALLS, ".".join(segs))
            return
        self.emit(RelationKind.CALLS, self._call_target(owner, rest, name))

    def _emit_name_use(
        self, toks: list[Tok], i: int, last: int, segs: list[str], prev: Tok | None
    ) -> None:
        head = segs[0]
        if head in self.locals:
            return
        fd = self.find_field(head)
        if fd is not None:
            if len(segs) == 1:
                self._emit_field_access(toks, last, fd, prev)
            return
        if len(segs) == 1:
            if head in self.type_params:
                return
            resolved = self.resolve_type(head)
            if resolved is not None and (
                resolved in self.b.types or "." in resolved
            ):
                # a bare type mention: multi-catch clause, class literal, ...
                self.emit_type_use(RelationKind.USES, head)
            return
        if len(segs) >= 2:
            owner = self.resolve_type(head)
            if owner is not None and owner in self.b.types:
                info = self.b.types[owner]
                if len(segs) == 2 and segs[1] in info.fields:
                    self._emit_field_access(toks, last, info.fields[segs[1]], prev)
                return
            if owner is not None:
                # static member access on a library type
                self.emit_type_use(RelationKind.USES, head)
            return
        return

    def _emit_field_access(
        self, toks: list[Tok], last: int, fd: FieldDecl, prev: Tok | None = None
    ) -> None:
        after = toks[last + 1] if last + 1 < len(toks) else None
        write = False
        read = True
        if after is not None and after.kind == "punct":
            if after.text in ASSIGN_OPS:
                write = True
                read = after.text != "="  # compound assignment also reads
            elif after.text in ("++", "--"):
                write = True
                read = False
        if prev is not None and prev.text in ("++", "--"):
            write = True
            read = False
        if write:
            self.emit(RelationKind.WRITES, fd.entity_id)
        if read:
            self.emit(RelationKind.READS, fd.entity_id)


# ---------------------------------------------------------------------------
# Relation pass over the declaration tree
# ---------------------------------------------------------------------------


class _RelationPass:
    def __init__(self, builder: _ProjectBuilder):
        self.b = builder
        self.r = _Resolver(builder)

    def run(self) -> None:
        for info in self.b.all_infos:
            self._emit_type(info)

    def _chain(self, info: _TypeInfo) -> list[_TypeInfo]:
        chain = []
        cur: _TypeInfo | None = info
        while cur is not None:
            chain.append(cur)
            cur = cur.outer
        return chain

    def _type_use(
        self, source: int, kind: RelationKind, name: str, syntax: FileSyntax,
        chain: list[_TypeInfo],
        skip: frozenset[str] = frozenset(),
    ) -> None:
        if not name or name in ("void", "var") or name in skip:
            return
        resolved = self.r.resolve(name, syntax, chain)
        target: int | str
        if resolved is not None and resolved in self.b.types:
            target = self.b.types[resolved].decl.entity_id
        else:
            target = resolved if resolved is not None else name
        self.b.relations.append(FactRelation(source, kind, target))

    def _emit_type(self, info: _TypeInfo) -> None:
        decl = info.decl
        syntax = info.file
        chain = self._chain(info)
        skip = frozenset(
            name for link in chain for name in link.decl.type_params
        )
        eid = decl.entity_id
        if decl.anon_super is not None:
            resolved = self.r.resolve(decl.anon_super.base, syntax, chain[1:] or chain)
            kind = RelationKind.EXTENDS
            if resolved is not None and resolved in self.b.types:
                target_kind = self.b.types[resolved].decl.kind
                if target_kind in ("interface", "annotation"):
                    kind = RelationKind.IMPLEMENTS
            elif resolved in KNOWN_JDK_INTERFACES:
                kind = RelationKind.IMPLEMENTS
            self._type_use(eid, kind, decl.anon_super.base, syntax, chain, skip)
        for bound in decl.type_param_bounds:
            self._type_use(eid, RelationKind.USES, bound, syntax, chain, skip)
        for ref in decl.extends:
            self._type_use(eid, RelationKind.EXTENDS, ref.base, syntax, chain, skip)
            for arg in ref.args:
                self._type_use(eid, RelationKind.USES, arg, syntax, chain, skip)
        for ref in decl.implements:
            self._type_use(eid, RelationKind.IMPLEMENTS, ref.base, syntax, chain, skip)
            for arg in ref.args:
                self._type_use(eid, RelationKind.USES, arg, syntax, chain, skip)
        for member in decl.members:
            if isinstance(member, FieldDecl):
                self._type_use(
                    member.entity_id, RelationKind.HOLDS, member.tref.base, syntax,
                    chain, skip,
                )
                for arg in member.tref.args:
                    self._type_use(
                        member.entity_id, RelationKind.USES, arg, syntax, chain, skip
                    )
                if member.stmts or member.anons:
                    self._run_body(member.stmts, member.anons, member.entity_id, info)
            elif isinstance(member, MethodDecl):
                self._emit_member(member, info)
            elif isinstance(member, InitDecl):
                self._run_body(member.stmts, member.anons, eid, info)
        for const in decl.consts:
            self.b.relations.append(
                FactRelation(const.entity_id, RelationKind.HOLDS, eid)
            )
            if const.stmts or const.anons:
                self._run_body(const.stmts, const.anons, eid, info)

    def _emit_member(self, member: MethodDecl, info: _TypeInfo) -> None:
        syntax = info.file
        chain = self._chain(info)
        skip = frozenset(
            name for link in chain for name in link.decl.type_params
        ) | frozenset(member.type_params)
        eid = member.entity_id
        for bound in member.type_param_bounds:
            self._type_use(eid, RelationKind.USES, bound, syntax, chain, skip)
        if member.ret is not None and not member.is_ctor:
            self._type_use(eid, RelationKind.USES, member.ret.base, syntax, chain, skip)
            for arg in member.ret.args:
                self._type_use(eid, RelationKind.USES, arg, syntax, chain, skip)
        for tref, _name in member.params:
            self._type_use(eid, RelationKind.USES, tref.base, syntax, chain, skip)
            for arg in tref.args:
                self._type_use(eid, RelationKind.USES, arg, syntax, chain, skip)
        for tref in member.throws:
            self._type_use(eid, RelationKind.USES, tref.base, syntax, chain, skip)
        if member.body_raw is None:
            return
        analyzer = _BodyAnalyzer(self.b, self.r, syntax, chain, eid, member.anons)
        analyzer.type_params.update(member.type_params)
        for tref, name in member.params:
            analyzer.locals[name] = tref
        analyzer.run(member.stmts)

    def _run_body(
        self, stmts: list[Tok], anons: list[TypeDecl], source: int, info: _TypeInfo
    ) -> None:
        analyzer = _BodyAnalyzer(
            self.b, self.r, info.file, self._chain(info), source, anons
        )
        analyzer.run(stmts)


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------


def extract_project(
    project_root: str | Path,
    project_id: str,
    *,
    first_id: int = 1,
) -> ProjectFacts:
    """Extract the fact model for every ``.java`` file under a directory.

    Files are processed in sorted relative-path order, so repeated runs on
    the same tree produce identical entity ids.  Unreadable files and
    unparseable declarations are skipped with a recorded warning.
    """
    root = Path(project_root)
    facts = ProjectFacts(project_id=project_id)
    builder = _ProjectBuilder(project_id, first_id)
    files = sorted(
        (p for p in root.rglob("*.java") if p.is_file()),
        key=lambda p: p.relative_to(root).as_posix(),
    )
    syntaxes: list[FileSyntax] = []
    total_sloc = 0
    for path in files:
        rel = path.relative_to(root).as_posix()
        try:
            text = path.read_bytes().decode("utf-8", errors="replace")
        except OSError as exc:
            facts.warnings.append(f"skipped-file {rel}: {exc}")
            log.warning("project=%s file=%s skipped: %s", project_id, rel, exc)
            continue
        total_sloc += count_sloc(text)
        try:
            syntax = parse_java_file(rel, text)
        except Exception as exc:  # tolerant by contract
            facts.warnings.append(f"skipped-file {rel}: parse failure {exc}")
            log.warning("project=%s file=%s parse failure: %s", project_id, rel, exc)
            facts.parse_warning_count += 1
            continue
        if syntax.parse_warnings:
            facts.parse_warning_count += syntax.parse_warnings
            facts.warnings.append(
                f"parse-warnings {rel}: {syntax.parse_warnings} declaration(s) skipped"
            )
        syntaxes.append(syntax)
    for syntax in syntaxes:
        builder.add_file(syntax)
    _RelationPass(builder).run()
    facts.entities = builder.entities
    facts.relations = builder.relations
    facts.sloc = total_sloc
    return facts


def classify_provenance(
    type_fqn: str,
    facts: ProjectFacts,
    jdk_prefixes: tuple[str, ...] | list[str] = DEFAULT_JDK_PREFIXES,
) -> Provenance:
    """Classify a used type as project-internal, JDK, or external."""
    if not type_fqn:
        raise ValueError("type_fqn must be non-empty")
    if type_fqn in facts.declared_type_fqns():
        return Provenance.INTERNAL
    for prefix in jdk_prefixes:
        if type_fqn.startswith(prefix):
            return Provenance.JDK
    return Provenance.EXTERNAL


def is_unresolved_name(type_fqn: str, declared: set[str]) -> bool:
    """A name with no package and no project declaration is unresolved."""
    return "." not in type_fqn and type_fqn not in declared


def read_manifest(manifest_path: str | Path) -> list[tuple[str, Path]]:
    """Read a corpus manifest: one project-root path per line.

    Returns (project_id, absolute root) pairs sorted by project id; the
    project id is the base name of the path.
    """
    manifest = Path(manifest_path)
    base = manifest.parent
    roots: list[tuple[str, Path]] = []
    for raw in manifest.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        p = Path(line)
        if not p.is_absolute():
            p = base / p
        roots.append((p.name, p))
    if not roots:
        raise EmptyCorpusError(f"manifest {manifest} lists no projects")
    roots.sort(key=lambda item: item[0])
    ids = [pid for pid, _ in roots]
    if len(ids) != len(set(ids)):
        dupes = sorted({x for x in ids if ids.count(x) > 1})
        raise DuplicateProjectError(f"duplicate project ids in manifest: {dupes}")
    return roots


def extract_corpus(manifest_path: str | Path) -> list[ProjectFacts]:
    """Extract every project listed in a manifest.

    Projects are independent units merged in sorted project-id order with
    corpus-wide contiguous entity ids.
    """
    out: list[ProjectFacts] = []
    next_id = 1
    for project_id, root in read_manifest(manifest_path):
        facts = extract_project(root, project_id, first_id=next_id)
        if facts.entities:
            next_id = max(e.entity_id for e in facts.entities) + 1
        out.append(facts)
    return out
