#![allow(dead_code)]

pub mod corpus;
pub mod enumerate;
pub mod hyperbolic;
