//! Frozen expectations for the published 51 x 10 signed chi-square table
//! (fixture `nchs2016_signed_cells.csv`).

/// Per-row (strongest, weakest) column read off the signed chi-square table
/// by exhaustive scan, frozen here. No row has a tie.
pub const EXTREMES: [(&str, &str, &str); 51] = [
    ("Alabama", "CLRD", "Cancer"),
    ("Alaska", "Suicide", "Heart disease"),
    ("Arizona", "Alzheimer's disease", "Kidney disease"),
    ("Arkansas", "CLRD", "Unintentional injuries"),
    (
        "California",
        "Alzheimer's disease",
        "Unintentional injuries",
    ),
    ("Colorado", "Suicide", "Heart disease"),
    ("Connecticut", "Unintentional injuries", "Stroke"),
    ("Delaware", "Cancer", "Diabetes"),
    ("District of Columbia", "Heart disease", "CLRD"),
    ("Florida", "Stroke", "Influenza and pneumonia"),
    ("Georgia", "Alzheimer's disease", "Heart disease"),
    ("Hawaii", "Influenza and pneumonia", "CLRD"),
    ("Idaho", "Suicide", "Kidney disease"),
    ("Illinois", "Kidney disease", "Unintentional injuries"),
    ("Indiana", "CLRD", "Influenza and pneumonia"),
    ("Iowa", "CLRD", "Kidney disease"),
    ("Kansas", "CLRD", "Alzheimer's disease"),
    ("Kentucky", "CLRD", "Stroke"),
    ("Louisiana", "Kidney disease", "Cancer"),
    ("Maine", "CLRD", "Heart disease"),
    ("Maryland", "Cancer", "Alzheimer's disease"),
    (
        "Massachusetts",
        "Unintentional injuries",
        "Alzheimer's disease",
    ),
    ("Michigan", "Heart disease", "Unintentional injuries"),
    ("Minnesota", "Alzheimer's disease", "Heart disease"),
    ("Mississippi", "Influenza and pneumonia", "Cancer"),
    ("Missouri", "Kidney disease", "Diabetes"),
    ("Montana", "Suicide", "Alzheimer's disease"),
    ("Nebraska", "CLRD", "Unintentional injuries"),
    ("Nevada", "Suicide", "Alzheimer's disease"),
    ("New Hampshire", "Unintentional injuries", "Stroke"),
    ("New Jersey", "Heart disease", "CLRD"),
    (
        "New Mexico",
        "Unintentional injuries",
        "Alzheimer's disease",
    ),
    ("New York", "Heart disease", "Alzheimer's disease"),
    ("North Carolina", "Kidney disease", "Heart disease"),
    ("North Dakota", "Alzheimer's disease", "Cancer"),
    ("Ohio", "Unintentional injuries", "Suicide"),
    ("Oklahoma", "CLRD", "Cancer"),
    ("Oregon", "Suicide", "Heart disease"),
    ("Pennsylvania", "Heart disease", "Alzheimer's disease"),
    ("Rhode Island", "Unintentional injuries", "Stroke"),
    ("South Carolina", "Alzheimer's disease", "Heart disease"),
    ("South Dakota", "Alzheimer's disease", "Kidney disease"),
    ("Tennessee", "CLRD", "Cancer"),
    ("Texas", "Alzheimer's disease", "Influenza and pneumonia"),
    ("Utah", "Suicide", "Cancer"),
    ("Vermont", "Alzheimer's disease", "Kidney disease"),
    ("Virginia", "Kidney disease", "Heart disease"),
    ("Washington", "Alzheimer's disease", "Kidney disease"),
    ("West Virginia", "Unintentional injuries", "Heart disease"),
    ("Wisconsin", "Unintentional injuries", "Heart disease"),
    ("Wyoming", "Suicide", "Alzheimer's disease"),
];
