pub mod interval;
pub mod reference;
pub mod scaled;
