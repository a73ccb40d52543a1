def test_import():
    import torushopf
