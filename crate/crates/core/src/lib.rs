pub mod axis;
pub mod cayley;
pub mod certificate;
pub mod curve;
pub mod curve_graph;
pub mod dynnikov;
pub mod report;
pub mod train_track;
pub mod words;
