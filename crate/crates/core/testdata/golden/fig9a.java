class Soundex {
    private char getMappingCode(final String charSequence, final int charIndex) {
        final char mappedChar = map(charSequence.charAt(charIndex));
        if (charIndex > 1 && mappedChar != '0') {
            final char hwChar = charSequence.charAt(charIndex - 1);
            if ('H' == hwChar || 'W' == hwChar) {
                return '0';
            }
        }
        return mappedChar;
    }

    private char map(final char ch) {
        return ch;
    }
}
