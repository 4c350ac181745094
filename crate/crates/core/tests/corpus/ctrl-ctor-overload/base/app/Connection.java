package app;

public class Connection {
    private String host;
    private int port;

    public Connection(String host) {
        this.host = host;
    }

    public boolean alive() {
        return host != null;
    }
}
