"""Пакет qbath: броунівський рух класичної частинки у квантовому термостаті."""
