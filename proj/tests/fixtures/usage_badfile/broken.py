TEXT = """never closed
print("hi")
