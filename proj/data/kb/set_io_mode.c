void set_io_mode(uint32_t gpio_base, uint32_t pin_mask, uint8_t mode) {
    volatile uint32_t *GPIO_MODER = (uint32_t *)(gpio_base + 0x00);
    uint8_t pin_number = 0;
    while ((pin_mask >> pin_number) != 1) {
        pin_number++;
    }
    *GPIO_MODER &= ~(0x3 << (pin_number * 2));
    *GPIO_MODER |= (mode << (pin_number * 2));
}
