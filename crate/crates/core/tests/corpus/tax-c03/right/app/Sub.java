package app;

public class Sub extends Base {

    @Override
    void run(int k) {
        System.out.println(k);
    }
}
