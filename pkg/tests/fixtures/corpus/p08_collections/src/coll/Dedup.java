package coll;

import java.util.*;

public class Dedup {

    public List<String> unique(List<String> values) {
        Set<String> seen = new LinkedHashSet<String>();
        for (String v : values) {
            seen.add(v.trim());
        }
        return new ArrayList<String>(seen);
    }

    public Map<String, Integer> frequencies(List<String> values) {
        Map<String, Integer> counts = new HashMap<String, Integer>();
        for (String v : values) {
            Integer old = counts.get(v);
            counts.put(v, old == null ? 1 : old + 1);
        }
        return counts;
    }
}
