package app;

public class View {
    private Profile profile;

    String header() {
        String n = profile.nick().orElse("");
        return n.toUpperCase();
    }

    void audit(String msg) {
        System.out.println(msg);
    }

    void trace(String msg) {
        System.err.println(msg);
    }

    String footer() {
        String n = profile.nick().orElse("");
        return n.toLowerCase();
    }
}
