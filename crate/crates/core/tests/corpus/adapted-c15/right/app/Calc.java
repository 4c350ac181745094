package app;

public class Calc {
    private int base;

    int compute(int x) {
        return base * x + 1;
    }

    int prepare(int y) {
        return compute(y) * 3;
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
