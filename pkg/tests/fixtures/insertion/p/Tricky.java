package p;

import java.util.List;

class Tricky {
    private int count;

    void layout(int a, int b, int c) {
        int x = 1;
        if (a > 0 &&
            b > 0 &&
            c > 0) {
            x = 2;
        }
        switch (x) {
            case 1:
                x++;
                break;
            default:
                x--;
        }
        foo(a,
            b);
        if (x > 3) count = x; else count = 0;
        for (int i = 0; i < x; i++) count += i;
    }

    int early(List<String> xs) {
        for (String s : xs) {
            if (s.isEmpty()) {
                continue;
            }
            count++;
        }
        try {
            return xs.size();
        } finally {
            count = 0;
        }
    }

    void lambdas(List<String> xs) {
        xs.forEach(s -> {
            count += s.length();
        });
        Runnable r = () -> count++;
        r.run();
    }

    void foo(int a, int b) { count = a + b; }

    static class Inner {
        private final String LOG = "not a logger";

        void work(int n) {
            while (n > 0) {
                n--;
            }
        }
    }
}
