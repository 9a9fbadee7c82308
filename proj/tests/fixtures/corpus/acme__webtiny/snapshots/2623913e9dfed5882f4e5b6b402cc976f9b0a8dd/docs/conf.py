project = "webtiny"
extensions = []
