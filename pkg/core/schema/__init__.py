"""Plain data types shared across shaketab modules."""
