package app;

public class Sub extends Base {

    long tally() {
        return 1;
    }
}
