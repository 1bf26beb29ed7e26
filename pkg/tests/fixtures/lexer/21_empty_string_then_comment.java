class T {
    String e = ""; // after empty
    String f = "\"\""; /* after quotes */
}
