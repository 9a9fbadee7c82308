from webtiny.router import Router


def test_dispatch():
    router = Router()
    router.add("/a/<x>", lambda request, x: x)
    assert router.dispatch("/a/1") == "1"
