package app;

public class Counter {
    private int total;
    private String name;

    void bump() {
        total = total + 1;
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
}
