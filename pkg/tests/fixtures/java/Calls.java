class Calls {
    void run() {
        a();
        b();
        a();
    }

    void a() {
    }

    void b() {
    }
}
