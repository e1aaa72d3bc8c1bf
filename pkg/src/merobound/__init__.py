"""Boundedness of meromorphic quotients f/g on the local bi-upper-half-plane."""
