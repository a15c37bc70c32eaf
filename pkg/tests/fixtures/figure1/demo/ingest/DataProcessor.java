package demo.ingest;

import java.util.HashMap;
import java.util.Map;

public class DataProcessor {
    public Map<String, String> process_data(Map<String, String> metadata) {
        Map<String, String> processed = new HashMap<>();
        String original = metadata.get("original_data");
        if (original != null) {
            processed.put("result", original.trim());
        }
        return processed;
    }
}
