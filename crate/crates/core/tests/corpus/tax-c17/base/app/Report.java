package app;

public class Report {
    private String title;

    String render(String body) {
        LegacyFormatter legacy = new LegacyFormatter();
        String head = legacy.format(title);
        return head + body;
    }

    void audit(String msg) {
        System.out.println(msg);
    }

    void trace(String msg) {
        System.err.println(msg);
    }
}
