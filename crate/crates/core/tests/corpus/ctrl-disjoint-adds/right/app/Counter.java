package app;

public class Counter {
    private int count;
    private String name;

    void bump() {
        count = count + 1;
    }

    String name() {
        return name;
    }

    void audit(String msg) {
        System.out.println(msg);
    }

    void trace(String msg) {
        System.err.println(msg);
    }

    int snapshot() {
        return count;
    }
}
