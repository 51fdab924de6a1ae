pub mod abstraction_cases;
pub mod criteria;
pub mod oracle;
