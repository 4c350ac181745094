package app;

public class Schema {
    private String ref;
    private String type;

    public void set$ref(String ref) {
        this.ref = ref;
    }

    public String type() {
        return type;
    }
}
