"""Check suites, one subpackage per certified property."""
