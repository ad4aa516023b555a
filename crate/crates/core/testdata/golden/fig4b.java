class KickCommand {
    boolean execute(boolean condition1, boolean condition2, boolean condition3) {
        if (!condition1) {
            prepare();
            if (condition2) {
                begin();
                if (condition3) {
                    apply();
                }
                finish();
            } else {
                fallback();
            }
            return true;
        } else {
            log();
            return false;
        }
    }

    void log() {}
    void prepare() {}
    void begin() {}
    void apply() {}
    void finish() {}
    void fallback() {}
}
