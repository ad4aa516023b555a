class Listing1 {
  public boolean containsDigitOrLetter(Character[] input) {
    for (Character c : input) {
      if (c != null
         && (Character.isDigit(c) || Character.isLetter(c))) {
        return true;
      }
    }
    return false;
  }
}
