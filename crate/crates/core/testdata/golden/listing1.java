class Listing1 {
  public boolean containsDigitOrLetter(Character[] input) {
    for (Character c : input) {                               //+1
      if (c != null                                           //+2 (nesting=1)
         && (Character.isDigit(c) || Character.isLetter(c)))  //+2
        return true;
    }
    return false;
  }                                    // Cognitive Complexity = 5
}
