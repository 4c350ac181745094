package app;

public class Client {
    private String host;
    private Connection conn;

    void open() {
        conn = new Connection(host);
        audit("open " + host);
    }

    void audit(String msg) {
        System.out.println(msg);
    }

    void trace(String msg) {
        System.err.println(msg);
    }

    void reopen() {
        conn = new Connection(host);
        trace("reopen " + host);
    }
}
