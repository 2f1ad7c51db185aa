package reg;

public enum Level {
    LOW, MEDIUM, HIGH;

    public boolean atLeast(Level other) {
        return ordinal() >= other.ordinal();
    }
}
