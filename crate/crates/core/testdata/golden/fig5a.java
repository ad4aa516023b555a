class EffectCommand {
    boolean execute(String[] args, Object player, boolean condition3, boolean condition4, int limit) {
        if (args.length < limit) {
            usage();
            return true;
        }
        if (player == null) {
            warn();
            return true;
        }
        if (condition3) {
            report();
            return true;
        }
        if (condition4) {
            applyEffect();
        }
        finish();
        return true;
    }

    void usage() {}
    void warn() {}
    void report() {}
    void applyEffect() {}
    void finish() {}
}
