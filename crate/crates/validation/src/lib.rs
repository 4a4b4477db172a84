//! Holds the `acceptance` test target, which checks the library against its
//! acceptance criteria and prints one line per criterion. It lives in its own
//! package so that cargo runs it after every other test suite.
