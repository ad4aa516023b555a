class MyBitInputStream {
    private int bitCache;
    private int bitsInCache;

    int readBits(final int sampleBits, final int sampleMask) {
        int sample;
        sample = sampleMask & this.bitCache >> this.bitsInCache - sampleBits;
        return sample;
    }
}
