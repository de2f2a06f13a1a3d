from dna_codec import app


def main():
    app.run()


if __name__ == "__main__":
    main()
