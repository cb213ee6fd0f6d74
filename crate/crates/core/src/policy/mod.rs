//! EXP3 and the windowed restart scheme built on it (WE3).

mod exp3;
mod we3;

pub use exp3::{exp3_run, exp3_trace, Exp3State, RENORMALIZE_ABOVE};
pub use we3::{run_plan, we3_gamma, we3_plan, we3_run, Segment, We3Plan};
