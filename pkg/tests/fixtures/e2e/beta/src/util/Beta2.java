/*
 * Licensed to the Apache Software Foundation (ASF) under one
 * or more contributor license agreements.
 */
package fixture;

/**
 * Given length returns parser sequence.
 *
 * @author nobody
 */
public class Beta2 {
    // FIXME length remove duplicate
    int field0 = 0; // default configuration parser
    // XXX consider list implement later
    int field1 = 1; // value buffer current parser node
    // TODO: rewrite length consider
    int field2 = 2; // configuration current element returns
    // XXX probably temporary maybe current
    int field3 = 3; // length configuration list buffer sequence
    // TODO: later name instance maybe
    int field4 = 4; // parser index name list length
    // FIXME: sequence given implement workaround
    int field5 = 5; // sequence list current
    // Sequence value index configuration
    int field6 = 6; // returns name element parser
    /* XXX default perhaps temporary probably
     * index given value */
    int field7 = 7; // configuration current parser name node
    // Parser node element given
    int field8 = 8; // default index value temporary
    // Current buffer list given rewrite
    int field9 = 9; // configuration returns instance index
    // consider temporary given workaround
    int field10 = 10; // length current buffer
}
