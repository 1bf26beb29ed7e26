/*
 * Licensed to the Apache Software Foundation (ASF) under one
 * or more contributor license agreements.
 */
package fixture;

/**
 * Configuration default node value.
 *
 * @author nobody
 */
public class Gamma1 {
    // workaround sequence temporary
    int field0 = 0; // current name given default refactor
    // TODO: parser ugly implement perhaps sequence
    int field1 = 1; // instance given sequence default
    // consider refactor implement buffer
    int field2 = 2; // value node default current
    // Element node instance parser
    int field3 = 3; // node name length
    // remove workaround later list
    int field4 = 4; // given list parser
    // FIXME consider list perhaps
    int field5 = 5; // sequence list default value
    // Sequence length instance configuration rewrite
    int field6 = 6; // default length instance configuration
    // HACK configuration cleanup duplicate buffer
    int field7 = 7; // length name current default buffer
    /* TODO: rewrite refactor sequence remove buffer
     * given index name value */
    int field8 = 8; // current default configuration given
    // Current node name sequence index duplicate
    int field9 = 9; // index list configuration
    // HACK length workaround temporary current refactor
    int field10 = 10; // parser returns instance length
}
