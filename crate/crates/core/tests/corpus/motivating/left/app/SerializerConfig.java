package app;

public class SerializerConfig {
    private String className;
    private String typeClassName;

    public void setClassName(String className) {
        this.className = className;
    }

    public void setTypeClassName(String typeClassName) {
        this.typeClassName = typeClassName;
    }

    public String getClassName() {
        return className;
    }

    public String getTypeClassName() {
        return typeClassName;
    }
}
