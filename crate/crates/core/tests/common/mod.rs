pub mod orientability_table;
