class Annotated {
    @Deprecated
    private int old;

    @Override
    public String toString() {
        return "A" + old;
    }

    @SuppressWarnings("unchecked")
    void raw() {
        old = 1;
    }
}
