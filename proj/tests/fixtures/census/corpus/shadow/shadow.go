package shadow

import "unsafe"

func Local() int {
	uintptr := 3
	return uintptr + 1
}

func Real(p unsafe.Pointer) uintptr {
	return uintptr(p)
}

func Param(uintptr int) int {
	return uintptr * 2
}
