class CharSequenceUtils {
    static boolean regionMatches(final CharSequence cs, final CharSequence other, final int length) {
        int remaining = length;
        while (remaining-- > 0) {
            final char c1 = cs.charAt(remaining);
            final char c2 = other.charAt(remaining);
            if (Character.toUpperCase(c1) != Character.toUpperCase(c2)
                    && Character.toLowerCase(c1) != Character.toLowerCase(c2)) {
                return false;
            }
        }
        return true;
    }
}
