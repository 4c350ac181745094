package app;

public class Calc {
    private int base;

    int compute(int x) {
        return base * x + 1;
    }

    void prepare() {
        base = compute(2);
    }

    void audit(String msg) {
        System.out.println(msg);
    }

    void trace(String msg) {
        System.err.println(msg);
    }

    int twice(int y) {
        return compute(y) * 2;
    }
}
