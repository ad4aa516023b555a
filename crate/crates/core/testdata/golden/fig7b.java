class CircularFifoQueue {
    private int start;
    private int end;
    private int maxElements;
    private boolean full;
    private int size;

    void updateSize() {
        size = this.end < this.start ? this.maxElements - this.start + this.end : (this.end == this.start ? (this.full ? this.maxElements : 0) : this.end - this.start);
    }
}
