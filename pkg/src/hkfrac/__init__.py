"""2D Hermite-Konhauser polynomials, bivariate Mittag-Leffler functions and fractional operators."""
