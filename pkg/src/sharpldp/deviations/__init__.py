"""Window probabilities, smoothed functionals and reports for Birkhoff sums."""
