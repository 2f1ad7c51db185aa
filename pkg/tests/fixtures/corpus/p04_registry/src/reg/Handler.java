package reg;

public interface Handler {
    void handle(String event);
}
