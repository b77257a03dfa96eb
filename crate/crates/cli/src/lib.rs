//! Command-line front end for `quadkit`: file formats, reports and the
//! worked-example reproduction.

pub mod app;
pub mod formats;
pub mod report;
pub mod reproduce;
