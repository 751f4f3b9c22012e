pub mod cv;
pub mod evaluate;
pub mod plot;
pub mod split;
pub mod train;
