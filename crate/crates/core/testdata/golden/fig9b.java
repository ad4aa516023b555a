class Soundex {
    private char getMappingCode(String charSequence, int charIndex) {
        char hwChar;
        char mappedChar = map(charSequence.charAt(charIndex));
        if (charIndex > 1 && mappedChar != '0' && ('H' == (hwChar = charSequence.charAt(charIndex - 1)) || 'W' == hwChar)) {
            return '0';
        }
        return mappedChar;
    }

    private char map(char ch) {
        return ch;
    }
}
