package golden;

import java.io.BufferedReader;
import java.io.IOException;
import java.io.Reader;
import java.util.List;
import java.util.Map;

public class Labeled {
    private int total;

    public void empty() { // [MethodDef#1
    } // MethodDef#1]

    public int straight(int a, int b) { // [MethodDef#1
        int c = a + b;
        return c * 2;
    } // MethodDef#1]

    public void simpleIf(int x) { // [MethodDef#1
        if (x > 0) { // [Branch#1
            total += x;
        } // Branch#1]
    } // MethodDef#1]

    public String ifElse(int x) { // [MethodDef#1
        if (x > 0) { // [Branch#1
            return "pos";
        } else {
            return "neg";
        } // Branch#1]
    } // MethodDef#1]

    public String chain(int x) { // [MethodDef#1
        if (x > 10) { // [Branch#1
            return "big";
        } else if (x > 5) {
            return "mid";
        } else if (x > 0) {
            return "small";
        } else {
            return "none";
        } // Branch#1]
    } // MethodDef#1]

    public void twoIfs(int x, int y) { // [MethodDef#1
        if (x > 0) { // [Branch#1
            total++;
        } // Branch#1]
        if (y > 0) { // [Branch#2
            total--;
        } // Branch#2]
    } // MethodDef#1]

    public void nestedIf(int x, int y) { // [MethodDef#1
        if (x > 0) { // [Branch#1
            if (y > 0) { // [Branch#2
                total = x + y;
            } // Branch#2]
        } // Branch#1]
    } // MethodDef#1]

    public int forLoop(int n) { // [MethodDef#1
        int s = 0;
        for (int i = 0; i < n; i++) { // [Loop#1
            s += i;
        } // Loop#1]
        return s;
    } // MethodDef#1]

    public int forEach(List<Integer> xs) { // [MethodDef#1
        int s = 0;
        for (int x : xs) { // [Loop#1
            s += x;
        } // Loop#1]
        return s;
    } // MethodDef#1]

    public void whileLoop(int n) { // [MethodDef#1
        while (n > 0) { // [Loop#1
            n--;
        } // Loop#1]
    } // MethodDef#1]

    public void doWhile(int n) { // [MethodDef#1
        do { // [Loop#1
            n--;
        } while (n > 0); // Loop#1]
    } // MethodDef#1]

    public void tryCatch(Reader r) { // [MethodDef#1
        try { // [TryCatch#1
            r.read();
        } catch (IOException e) {
            total = -1;
        } // TryCatch#1]
    } // MethodDef#1]

    public void tryCatchFinally(Reader r) { // [MethodDef#1
        try { // [TryCatch#1
            r.read();
        } catch (IOException e) {
            total = -1;
        } catch (RuntimeException e) {
            total = -2;
        } finally {
            total++;
        } // TryCatch#1]
    } // MethodDef#1]

    public String tryWithResources(Reader in) throws IOException { // [MethodDef#1
        try (BufferedReader br = new BufferedReader(in)) { // [TryCatch#1
            return br.readLine();
        } // TryCatch#1]
    } // MethodDef#1]

    public void loopInIf(List<Integer> xs, boolean go) { // [MethodDef#1
        if (go) { // [Branch#1
            for (int x : xs) { // [Loop#1
                total += x;
            } // Loop#1]
        } // Branch#1]
    } // MethodDef#1]

    public void ifInLoop(List<Integer> xs) { // [MethodDef#1
        for (int x : xs) { // [Loop#1
            if (x < 0) { // [Branch#1
                break;
            } // Branch#1]
            total += x;
        } // Loop#1]
    } // MethodDef#1]

    public void tryInLoop(List<Reader> rs) { // [MethodDef#1
        for (Reader r : rs) { // [Loop#1
            try { // [TryCatch#1
                r.read();
            } catch (IOException e) {
                continue;
            } // TryCatch#1]
        } // Loop#1]
    } // MethodDef#1]

    public void loopInTry(List<Reader> rs) { // [MethodDef#1
        try { // [TryCatch#1
            for (Reader r : rs) { // [Loop#1
                r.read();
            } // Loop#1]
        } catch (IOException e) {
            total = 0;
        } // TryCatch#1]
    } // MethodDef#1]

    public void ifInCatch(Reader r, boolean strict) { // [MethodDef#1
        try { // [TryCatch#1
            r.read();
        } catch (IOException e) {
            if (strict) { // [Branch#1
                throw new IllegalStateException("read failed");
            } // Branch#1]
        } // TryCatch#1]
    } // MethodDef#1]

    public String classicSwitch(int code) { // [MethodDef#1
        String name;
        switch (code) { // [Branch#1
            case 1:
                name = "one";
                break;
            case 2:
                name = "two";
                break;
            default:
                name = "many";
        } // Branch#1]
        return name;
    } // MethodDef#1]

    public int arrowSwitch(String s) { // [MethodDef#1
        switch (s) { // [Branch#1
            case "a" -> total = 1;
            case "b" -> total = 2;
            default -> total = 0;
        } // Branch#1]
        return total;
    } // MethodDef#1]

    public void labeledLoops(int[][] grid) { // [MethodDef#1
        outer:
        for (int[] row : grid) { // [Loop#1
            for (int v : row) { // [Loop#2
                if (v < 0) { // [Branch#1
                    break outer;
                } // Branch#1]
            } // Loop#2]
        } // Loop#1]
    } // MethodDef#1]

    public void braceless(int x) { // [MethodDef#1
        if (x > 0) total = x; // [Branch#1 Branch#1]
        for (int i = 0; i < x; i++) total += i; // [Loop#1 Loop#1]
    } // MethodDef#1]

    public void multiLineHeader(int a, int b, int c) { // [MethodDef#1
        if (a > 0 && // [Branch#1
                b > 0 &&
                c > 0) {
            total = a + b + c;
        } // Branch#1]
    } // MethodDef#1]

    public void lambdaBody(List<Integer> xs) { // [MethodDef#1
        xs.forEach(x -> {
            if (x > 0) {
                total += x;
            }
        });
    } // MethodDef#1]

    public Runnable anonymous() { // [MethodDef#1
        return new Runnable() {
            public void run() {
                for (int i = 0; i < 3; i++) {
                    total++;
                }
            }
        };
    } // MethodDef#1]

    public void synchronizedBlock(Map<String, Integer> m) { // [MethodDef#1
        synchronized (m) {
            if (m.isEmpty()) { // [Branch#1
                m.put("k", 1);
            } // Branch#1]
        }
    } // MethodDef#1]

    public Labeled(int start) { // [MethodDef#1
        if (start > 0) { // [Branch#1
            total = start;
        } // Branch#1]
    } // MethodDef#1]

    static int mixed(int[] xs) { // [MethodDef#1
        int s = 0;
        for (int i = 0; i < xs.length; i++) { // [Loop#1
            try { // [TryCatch#1
                if (xs[i] % 2 == 0) { // [Branch#1
                    s += xs[i];
                } else {
                    s -= xs[i];
                } // Branch#1]
            } catch (ArithmeticException e) {
                s = 0;
            } // TryCatch#1]
        } // Loop#1]
        while (s > 100) { // [Loop#2
            s /= 2;
        } // Loop#2]
        if (s < 0) { // [Branch#2
            s = -s;
        } // Branch#2]
        return s;
    } // MethodDef#1]
}
