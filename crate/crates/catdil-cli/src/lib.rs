//! JSON interchange formats and the channel-hierarchy classifier backing the
//! command-line tool.

pub mod classify;
pub mod format;
