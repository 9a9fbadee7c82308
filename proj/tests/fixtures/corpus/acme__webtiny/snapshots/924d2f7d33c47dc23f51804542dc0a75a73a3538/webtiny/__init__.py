from webtiny.router import Router
from webtiny.response import Response
