import java.util.*;

class Words {
    List<String> upper(List<String> words) {
        List<String> out = new ArrayList<>();
        for (String w : words) {
            out.add(w.toUpperCase());
        }
        return out;
    }
}
