package toml

import "unsafe"

// Size reports the width of a pointer.
func Size() uintptr { return unsafe.Sizeof(uintptr(0)) }
