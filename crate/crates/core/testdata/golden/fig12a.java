class PlaySoundCommand {
    void dispatch(boolean condition1, boolean condition2, boolean condition3, boolean condition4) {
        if (condition1) {
            handleFirst();
        } else if (condition2) {
            handleSecond();
        } else if (condition3) {
            handleThird();
        } else if (condition4) {
            handleFourth();
        }
    }

    void handleFirst() {}
    void handleSecond() {}
    void handleThird() {}
    void handleFourth() {}
}
