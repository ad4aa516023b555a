class BlockIterator {
    private static final int gridSize = 1 << 24;

    private int secondError;

    BlockIterator(final double secondd) {
        secondError = floor(secondd * gridSize);
    }

    private static int floor(final double value) {
        return (int) value;
    }
}
