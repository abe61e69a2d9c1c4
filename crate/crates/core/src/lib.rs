pub mod scalar;
pub mod freealg;
pub mod series;
pub mod presentations;
pub mod report;
pub mod hopf;
pub mod linalg;
pub mod cybe;
pub mod fundrep;
pub mod rtt;
pub mod fields;
pub mod cli;
