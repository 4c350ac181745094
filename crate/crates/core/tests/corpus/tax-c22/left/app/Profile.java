package app;

import java.util.Optional;

public class Profile {
    private String nick;

    public Optional<String> nick() {
        return Optional.ofNullable(nick);
    }

    public boolean named() {
        return nick != null;
    }
}
