pub mod track;
pub mod orbit;
