package shop.store;

import java.util.HashMap;
import java.util.Map;
import org.slf4j.Logger;
import org.slf4j.LoggerFactory;
import shop.orders.OrderService;

public class Main {
    private static final Logger logger = LoggerFactory.getLogger(Main.class);

    public static void main(String[] args) {
        Inventory inventory = new Inventory();
        try {
            inventory.restock("apple", 5);
            OrderService service = new OrderService(inventory);
            Map<String, Integer> orders = new HashMap<>();
            orders.put("apple", 2);
            int failures = service.flush(orders);
            if (failures > 0) {
                logger.warn("Unexpected state in main: {}", failures);
            }
        } catch (IllegalArgumentException e) {
            logger.error("Failed to main: {}", e);
        }
    }
}
