package app;

public class Shop {
    private int stock;

    void restock(int n) {
        stock = stock + n;
    }

    void audit(String msg) {
        System.out.println(msg);
    }

    void trace(String msg) {
        System.err.println(msg);
    }

    int total() {
        Gadget w = new Gadget();
        w.resize(stock);
        return w.size();
    }
}
