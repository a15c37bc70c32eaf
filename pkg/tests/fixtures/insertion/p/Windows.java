package p;

class Windows {
    int twice(int v) {
        int r = v * 2;
        return r;
    }
}
