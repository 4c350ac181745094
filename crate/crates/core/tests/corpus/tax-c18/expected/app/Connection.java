package app;

public class Connection {
    private String host;
    private int port;

    public Connection(String host, int port) {
        this.host = host;
        this.port = port;
    }

    public boolean alive() {
        return host != null;
    }
}
