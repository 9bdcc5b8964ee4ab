pub mod error;
pub mod exact;
pub mod graph;
pub mod oracle;
pub mod random;
pub mod connect;
pub mod strong;
pub mod kconn;
pub mod diameter;
pub mod tolerant;
pub mod bench;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/connectivity.md")]
    mod connectivity {}
    #[doc = include_str!("../../../book/src/strong.md")]
    mod strong {}
    #[doc = include_str!("../../../book/src/kconn.md")]
    mod kconn {}
    #[doc = include_str!("../../../book/src/diameter.md")]
    mod diameter {}
    #[doc = include_str!("../../../book/src/tolerant.md")]
    mod tolerant {}
    #[doc = include_str!("../../../book/src/bench.md")]
    mod bench {}
}
