package app;

public class Limits {
    private int low;
    private int high;

    int low() {
        return low;
    }

    void audit(String msg) {
        System.out.println(msg);
    }

    void trace(String msg) {
        System.err.println(msg);
    }

    void clear() {
        low = 0;
        high = 0;
    }
}
