class EffectCommand {
    boolean execute(String[] args, Object player, boolean condition3, boolean condition4, int limit) {
        if (args.length < limit) {
            usage();
            return true;
        } else {
            if (player == null) {
                warn();
                return true;
            } else if (!condition3) {
                if (condition4) {
                    applyEffect();
                }
                finish();
            } else {
                report();
                return true;
            }
        }
        return true;
    }

    void usage() {}
    void warn() {}
    void report() {}
    void applyEffect() {}
    void finish() {}
}
