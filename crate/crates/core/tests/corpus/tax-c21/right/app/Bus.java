package app;

public class Bus {
    private int sent;

    public void send(String msg) {
        sent = sent + 1;
    }

    public int sent() {
        return sent;
    }
}
