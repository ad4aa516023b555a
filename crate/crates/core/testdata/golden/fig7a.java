class CircularFifoQueue {
    private int start;
    private int end;
    private int maxElements;
    private boolean full;
    private int size;

    void updateSize() {
        if (end < start) {
            size = maxElements - start + end;
        } else if (end == start) {
            size = full ? maxElements : 0;
        } else {
            size = end - start;
        }
    }
}
