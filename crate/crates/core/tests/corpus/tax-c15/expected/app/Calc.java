package app;

public class Calc {
    private int base;

    int calculate(int x) {
        return base * x + 1;
    }

    void prepare() {
        base = calculate(2);
    }

    void audit(String msg) {
        System.out.println(msg);
    }

    void trace(String msg) {
        System.err.println(msg);
    }

    int twice(int y) {
        return calculate(y) * 2;
    }
}
