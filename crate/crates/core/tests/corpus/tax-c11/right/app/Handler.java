package app;

public interface Handler {
    void handle(String msg);

    void start(int delay);
}
