package main

import (
	"example.com/corpus/alias"
	"example.com/corpus/usetoml"
)

func main() {
	_ = alias.Size()
	_ = usetoml.Width()
}
