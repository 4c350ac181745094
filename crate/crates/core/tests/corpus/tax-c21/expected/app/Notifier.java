package app;

public class Notifier {
    private Bus bus;

    void notify(String msg) {
        bus.send(msg, 1);
        audit(msg);
    }

    void audit(String msg) {
        System.out.println(msg);
    }

    void trace(String msg) {
        System.err.println(msg);
    }

    void alert(String msg) {
        bus.send(msg, 1);
        trace("alert " + msg);
    }
}
