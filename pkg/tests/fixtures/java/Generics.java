import java.util.ArrayList;
import java.util.HashMap;
import java.util.List;
import java.util.Map;

class Generics<T> {
    private Map<String, List<Integer>> index = new HashMap<>();

    <R> List<R> wrap(R item) {
        List<R> out = new ArrayList<>();
        out.add(item);
        return out;
    }

    int size(Map<String, List<Integer>> m) {
        return m.size() + index.size();
    }
}
