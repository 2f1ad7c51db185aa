package mixed;

public class CopyJob extends Job implements Comparable<CopyJob> {
    private int priority;

    public CopyJob(String id, int priority) {
        super(id);
        this.priority = priority;
    }

    public void run() {
        record("copy started");
        record("copy finished");
    }

    public int compareTo(CopyJob other) {
        return Integer.compare(priority, other.priority);
    }
}
