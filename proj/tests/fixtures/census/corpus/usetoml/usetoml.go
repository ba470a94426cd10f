package usetoml

import (
	"unsafe"

	"github.com/BurntSushi/toml"
)

func Width() uintptr {
	return toml.Size()
}

func Bytes(s string) []byte {
	return unsafe.Slice((*byte)(unsafe.Pointer(unsafe.StringData(s))), len(s))
}
