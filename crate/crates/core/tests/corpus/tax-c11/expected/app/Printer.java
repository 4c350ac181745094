package app;

public class Printer implements Handler {
    private int seen;

    @Override
    public void handle(String msg) {
        seen = seen + 1;
    }

    public void begin(int delay) {
        seen = delay;
    }

    int seen() {
        return seen;
    }
}
