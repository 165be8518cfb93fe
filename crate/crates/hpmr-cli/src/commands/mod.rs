pub mod baseline;
pub mod optimize;
pub mod report;
pub mod sample;
pub mod train;
