class BlockIterator {
    private static final int gridSize = 16777216;

    private int secondError;

    BlockIterator(final double secondd) {
        this.secondError = NumberConversions.floor(secondd * 1.6777216E7);
    }

    private static class NumberConversions {
        static int floor(final double value) {
            return (int) value;
        }
    }
}
