"""Golden CLI invocations: file stem -> argv (``--json`` is appended)."""

GOLDEN = {
    "analyze_constant_coeff": ["analyze", "y'' - 3*y' + 2*y = 0"],
    "analyze_euler": ["analyze", "x^2*y'' + x*y' - y = 0"],
    "analyze_airy": ["analyze", "y'' = x*y"],
    "riccati_constant_coeff": ["riccati", "y''-3*y'+2*y=0"],
    "riccati_hom_square": ["riccati-hom", "y*y'' + y'^2 = 0"],
    "xi_check_fails": ["xi-check", "y*y'' - y'^2 = 0"],
    "xi_check_holds": ["xi-check", "y*y'' + y'^2 = 0"],
    "reduce_order_known": ["reduce-order", "y'' - 3*y' + 2*y = 0", "--u1", "1"],
    "puiseux_hyperbola": ["puiseux-expand", "z^2 = y^2 + 1", "--terms", "3"],
    "puiseux_cusp": ["puiseux-expand", "z^3 = y^2", "--terms", "3"],
    "dn_3": ["dn", "3"],
}

# canonical equation texts whose printed form must parse back to the same object
CANONICAL = [
    "y'' - 3*y' + 2*y = 0",
    "y'' + (1/x)*y' - (1/x^2)*y = 0",
    "y'' - x*y = 0",
    "y''' - 6*y'' + 11*y' - 6*y = 0",
    "y^(4) + y = 0",
    "u^2 = 3*u - 2 - u'",
    "u^3 = x*u' + 1",
    "y*y'' + y'^2 = 0",
    "z^2 - y^2 - 1 = 0",
    "z^3 + y*z - y^2 = 0",
]


if __name__ == "__main__":
    import contextlib
    import io
    import pathlib

    from genquad.cli import main

    here = pathlib.Path(__file__).parent / "golden"
    here.mkdir(exist_ok=True)
    for stem, argv in GOLDEN.items():
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            assert main([*argv, "--json"]) == 0, stem
        (here / f"{stem}.json").write_text(buf.getvalue())
