class ElseIf {
    private static final int LOW = 10;

    String grade(int score) {
        if (score >= 90) {
            return "A";
        } else if (score >= 75) {
            return "B";
        } else if (score > LOW) {
            return "C";
        }
        return "F";
    }
}
