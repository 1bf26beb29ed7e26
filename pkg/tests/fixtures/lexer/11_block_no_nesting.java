/* outer /* inner */ int z; /* second */
class J {}
