pub mod congruence;
pub mod error;
pub mod expr;
pub mod identities;
pub mod oracle;
pub mod products;
pub mod props;
pub mod series;

pub use congruence::{
    claim_catalog, verify_claim, ClaimStatus, CongruenceClaim, VerificationReport,
};
pub use error::{Error, Result};
pub use expr::{expand, Expr};
pub use oracle::BiregularConstraint;
pub use products::{
    eta_power, eta_quotient, pochhammer, theta_expand, theta_product_form, ProductSpec, QArg, Sign,
    ThetaSpec,
};
pub use series::{series_congruent, DissectionParts, TruncatedSeries};
