/*
 * Licensed to the Apache Software Foundation (ASF) under one
 * or more contributor license agreements.
 */
package fixture;

/**
 * List index node.
 *
 * @author nobody
 */
public class Beta4 {
    // Current list index sequence
    int field0 = 0; // given index list sequence
    // Default parser element name node
    int field1 = 1; // element node index parser
    String s2 = "// TODO temporary inside a string";
    int field2 = 2; // element list index parser remove
    // Length configuration sequence
    int field3 = 3; // list buffer length default parser
    // Name sequence given instance value
    int field4 = 4; // given list length
    // Name current sequence
    int field5 = 5; // parser buffer index
    // TODO maybe implement value
    int field6 = 6; // element returns value list
    // Sequence instance list node element
    int field7 = 7; // default node configuration sequence returns
    /* TODO: refactor ugly buffer
     * parser value instance element sequence */
    int field8 = 8; // length index list returns
    /* HACK implement default remove configuration
     * element current name length */
    int field9 = 9; // sequence buffer index configuration current
    // Name element current
    int field10 = 10; // length name default sequence returns
    // Default instance configuration
    int field11 = 11; // parser sequence value list returns
}
