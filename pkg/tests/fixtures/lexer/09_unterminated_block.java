class H {
    int y;
    /* this block never
       ends
