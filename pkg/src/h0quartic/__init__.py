"""Certified evaluation of h0 on the Arakelov class group of totally complex
quartic fields containing an imaginary quadratic field."""

__version__ = "0.1.0"
